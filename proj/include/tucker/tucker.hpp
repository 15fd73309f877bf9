#pragma once

// Umbrella header for the Tucker sketching library.
#include "tucker/bench.hpp"
#include "tucker/datagen.hpp"
#include "tucker/errors.hpp"
#include "tucker/image.hpp"
#include "tucker/linalg.hpp"
#include "tucker/metrics.hpp"
#include "tucker/pipelines.hpp"
#include "tucker/rng.hpp"
#include "tucker/serialize.hpp"
#include "tucker/sketch.hpp"
#include "tucker/tensor.hpp"
