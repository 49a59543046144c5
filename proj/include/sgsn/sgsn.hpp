#pragma once

// Umbrella header for the Stern-Gerlach + Schrodinger-Newton simulator.

#include "config.hpp"
#include "errors.hpp"
#include "evolve.hpp"
#include "fft.hpp"
#include "grid.hpp"
#include "observables.hpp"
#include "params.hpp"
#include "potentials.hpp"
#include "runner.hpp"
#include "spinor.hpp"
#include "tridiag.hpp"
#include "units.hpp"
#include "verify.hpp"
