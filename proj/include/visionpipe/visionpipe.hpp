#pragma once

// Umbrella header.

#include "visionpipe/batch.hpp"
#include "visionpipe/color_stages.hpp"
#include "visionpipe/demosaic.hpp"
#include "visionpipe/denoise.hpp"
#include "visionpipe/energy.hpp"
#include "visionpipe/energy_report.hpp"
#include "visionpipe/image.hpp"
#include "visionpipe/image_io.hpp"
#include "visionpipe/inverse_stages.hpp"
#include "visionpipe/lognormal.hpp"
#include "visionpipe/metrics.hpp"
#include "visionpipe/pipeline.hpp"
#include "visionpipe/pipeline_config.hpp"
#include "visionpipe/profile.hpp"
#include "visionpipe/quant_levels.hpp"
#include "visionpipe/quantizer.hpp"
#include "visionpipe/sensor.hpp"
#include "visionpipe/synth.hpp"
