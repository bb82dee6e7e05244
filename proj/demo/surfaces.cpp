// Small tour: admissibility of d, areas of a few surfaces by both routes,
// and the smallest areas in the census for d = 3.

#include <iostream>

#include "tgsurf/tgsurf.hpp"

int main()
{
    using namespace tgsurf;

    for (std::int64_t d : {3, 15, 23, 39}) {
        const Admissibility a = is_admissible(d);
        std::cout << "d=" << d << " h=" << a.group->h << " " << a.reason << "\n";
    }

    for (const SurfaceIndex idx : {SurfaceIndex{3, 1, -1, 1}, SurfaceIndex{15, 5, -5, 3}, SurfaceIndex{15, 3, -1, 3}}) {
        const ExactArea closed = area_closed_form(idx);
        const OrderAreaReport order = area_via_order_report(idx);
        std::cout << "S(" << idx.m << "," << idx.c << "," << idx.r << ") in d=" << idx.d << ": " << closed.symbolic()
                  << "  order disc " << order.reduced_disc << "  agree=" << (closed == order.area) << "\n";
    }

    const CensusResult census = enumerate_surfaces(3, Rational::from_decimal("5"));
    for (const SurfaceRecord& s : census.records)
        std::cout << "m=" << s.m << " c=" << s.c << " D=" << s.D << " area=" << area_decimal({s.q}, 6) << "\n";
}
