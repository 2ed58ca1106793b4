#pragma once

// Umbrella header: Levy models and symbols, path simulation, semigroup
// backends, nonlocal operators, smoothing estimators, perturbed dynamics,
// Campanato machinery and the verification suites.

#include "levysmooth/common.hpp"
#include "levysmooth/rng.hpp"
#include "levysmooth/interp.hpp"
#include "levysmooth/quadrature.hpp"
#include "levysmooth/levy_measure.hpp"
#include "levysmooth/levy_model.hpp"
#include "levysmooth/qweight.hpp"
#include "levysmooth/fft.hpp"
#include "levysmooth/grid_function.hpp"
#include "levysmooth/parallel.hpp"
#include "levysmooth/path_sim.hpp"
#include "levysmooth/semigroup.hpp"
#include "levysmooth/nonlocal.hpp"
#include "levysmooth/report.hpp"
#include "levysmooth/estimators.hpp"
#include "levysmooth/perturbed.hpp"
#include "levysmooth/campanato.hpp"
#include "levysmooth/config.hpp"
#include "levysmooth/svg.hpp"
#include "levysmooth/verify.hpp"
