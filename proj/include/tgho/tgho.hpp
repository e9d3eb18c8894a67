#pragma once

// Umbrella header: heat transport in harmonic chains coupled to multiple
// Langevin baths.

#include "tgho/chain.hpp"
#include "tgho/checks.hpp"
#include "tgho/config.hpp"
#include "tgho/csv.hpp"
#include "tgho/experiments.hpp"
#include "tgho/greens.hpp"
#include "tgho/landauer.hpp"
#include "tgho/md.hpp"
#include "tgho/quadrature.hpp"
#include "tgho/report_io.hpp"
#include "tgho/version.hpp"
