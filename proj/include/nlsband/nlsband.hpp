#pragma once

#include "nlsband/errors.hpp"
#include "nlsband/elliptic.hpp"
#include "nlsband/quadrature.hpp"
#include "nlsband/tolerances.hpp"
#include "nlsband/band.hpp"
#include "nlsband/solution.hpp"
