#pragma once

// Umbrella header for the whole toolkit.

#include "qpr/affine.hpp"
#include "qpr/certifier.hpp"
#include "qpr/common.hpp"
#include "qpr/counterexamples.hpp"
#include "qpr/json_io.hpp"
#include "qpr/ontic.hpp"
#include "qpr/pauli.hpp"
#include "qpr/reduction.hpp"
