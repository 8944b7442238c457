// Copyright 2026 greendc contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef GREENDC_GREENDC_HPP
#define GREENDC_GREENDC_HPP

#include "greendc/economics.hpp"
#include "greendc/errors.hpp"
#include "greendc/forecast.hpp"
#include "greendc/io.hpp"
#include "greendc/model.hpp"
#include "greendc/power.hpp"
#include "greendc/sim.hpp"
#include "greendc/strategies.hpp"

#endif  // GREENDC_GREENDC_HPP
