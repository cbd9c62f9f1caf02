#pragma once

#include "sbmca/blocking.hpp"
#include "sbmca/dictionary.hpp"
#include "sbmca/dictlearn.hpp"
#include "sbmca/errors.hpp"
#include "sbmca/grid.hpp"
#include "sbmca/io.hpp"
#include "sbmca/metrics.hpp"
#include "sbmca/separators.hpp"
#include "sbmca/solvers.hpp"
#include "sbmca/synth.hpp"
#include "sbmca/wav.hpp"
