#pragma once

#include "rhg/geometry.hpp"
#include "rhg/rng.hpp"
#include "rhg/sampler.hpp"
#include "rhg/builder.hpp"
#include "rhg/components.hpp"
#include "rhg/audits.hpp"
#include "rhg/io.hpp"
#include "rhg/harness.hpp"
