// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "sumlab/accumulate.hpp"
#include "sumlab/convolution.hpp"
#include "sumlab/functionals.hpp"
#include "sumlab/grid.hpp"
#include "sumlab/holder.hpp"
#include "sumlab/kernel.hpp"
#include "sumlab/mellin.hpp"
#include "sumlab/prefix.hpp"
#include "sumlab/report.hpp"
#include "sumlab/signal.hpp"
#include "sumlab/verify.hpp"
