#pragma once

// Umbrella header.

#include "mcat/coeff.hpp"
#include "mcat/linalg.hpp"
#include "mcat/algebra.hpp"
#include "mcat/spaces.hpp"
#include "mcat/cuplength.hpp"
#include "mcat/invariants.hpp"
#include "mcat/serialize.hpp"
#include "mcat/model_io.hpp"
#include "mcat/golden.hpp"
