// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "enclosure/errors.hpp"
#include "enclosure/vec3.hpp"
#include "enclosure/geometry.hpp"
#include "enclosure/quadrature.hpp"
#include "enclosure/sources.hpp"
#include "enclosure/trace.hpp"
#include "enclosure/transform.hpp"
#include "enclosure/solver1d.hpp"
#include "enclosure/solver3d.hpp"
#include "enclosure/indicator.hpp"
#include "enclosure/extraction.hpp"
#include "enclosure/pipeline.hpp"
