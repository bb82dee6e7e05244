#pragma once

#include "tgsurf/census.hpp"
#include "tgsurf/classgroup.hpp"
#include "tgsurf/error.hpp"
#include "tgsurf/euler.hpp"
#include "tgsurf/hermitian.hpp"
#include "tgsurf/imag_quadratic.hpp"
#include "tgsurf/ntkernel.hpp"
#include "tgsurf/quatorder.hpp"
#include "tgsurf/verify.hpp"
#include "tgsurf/volume.hpp"
