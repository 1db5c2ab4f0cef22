#pragma once

// Umbrella header: linear regression with short-memory stationary errors.

#include "tsreg/ar.hpp"
#include "tsreg/autocov.hpp"
#include "tsreg/cov_methods.hpp"
#include "tsreg/csv.hpp"
#include "tsreg/errors.hpp"
#include "tsreg/experiments.hpp"
#include "tsreg/formula.hpp"
#include "tsreg/inference.hpp"
#include "tsreg/json_io.hpp"
#include "tsreg/ols.hpp"
#include "tsreg/plot_data.hpp"
#include "tsreg/processes.hpp"
#include "tsreg/rng.hpp"
#include "tsreg/special_functions.hpp"
#include "tsreg/spectral.hpp"
