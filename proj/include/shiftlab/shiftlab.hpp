#pragma once

// Everything except the JSON layer (shiftlab/json.hpp), which additionally needs nlohmann/json.

#include "shiftlab/core.hpp"
#include "shiftlab/counting.hpp"
#include "shiftlab/ct_decomp.hpp"
#include "shiftlab/error.hpp"
#include "shiftlab/exact.hpp"
#include "shiftlab/factor.hpp"
#include "shiftlab/language.hpp"
#include "shiftlab/product.hpp"
#include "shiftlab/refute.hpp"
#include "shiftlab/refute_check.hpp"
#include "shiftlab/spec_certify.hpp"
