#pragma once

#include "bv/acceptance.hpp"
#include "bv/bubble.hpp"
#include "bv/core.hpp"
#include "bv/error.hpp"
#include "bv/io.hpp"
#include "bv/laplacian.hpp"
#include "bv/moving_plane.hpp"
#include "bv/ode.hpp"
#include "bv/parallel.hpp"
#include "bv/potential.hpp"
#include "bv/quadrature.hpp"
#include "bv/radial_shooting.hpp"
