// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "idel/numcore/adam.hpp"
#include "idel/numcore/gradcheck.hpp"
#include "idel/numcore/ops.hpp"
#include "idel/numcore/rng.hpp"
#include "idel/numcore/tensor.hpp"
