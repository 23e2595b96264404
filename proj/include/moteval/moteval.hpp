// SPDX-License-Identifier: MIT
// Copyright (c) 2026 moteval contributors
//
// Umbrella header.
#pragma once

#include "moteval/assignment.hpp"
#include "moteval/core.hpp"
#include "moteval/detection.hpp"
#include "moteval/io.hpp"
#include "moteval/matching.hpp"
#include "moteval/metrics.hpp"
#include "moteval/param_search.hpp"
#include "moteval/synth.hpp"
#include "moteval/util.hpp"
#include "moteval/visibility.hpp"
#include "moteval/zip.hpp"
