// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2025 The asyncmimo authors

#pragma once

#include "asyncmimo/channel.hpp"
#include "asyncmimo/delay.hpp"
#include "asyncmimo/discretize.hpp"
#include "asyncmimo/errors.hpp"
#include "asyncmimo/experiments.hpp"
#include "asyncmimo/moments.hpp"
#include "asyncmimo/parallel.hpp"
#include "asyncmimo/pulse.hpp"
#include "asyncmimo/quadrature.hpp"
#include "asyncmimo/rates.hpp"
#include "asyncmimo/receivers.hpp"
#include "asyncmimo/rng.hpp"
