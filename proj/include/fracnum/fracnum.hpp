#pragma once

// Umbrella header: Grunwald/L1 operators for the Caputo derivative, marching
// schemes for the fractional relaxation equation, an implicit second-order
// scheme for the time-fractional diffusion equation, and the grid-refinement
// harness that measures their convergence orders.

#include "fracnum/fractional_order.hpp"
#include "fracnum/weights.hpp"
#include "fracnum/caputo.hpp"
#include "fracnum/mittag_leffler.hpp"
#include "fracnum/ode.hpp"
#include "fracnum/subdiffusion.hpp"
#include "fracnum/convergence.hpp"
