#pragma once

// Umbrella header for the leafid library.

#include "leafid/color_features.hpp"
#include "leafid/dataset.hpp"
#include "leafid/errors.hpp"
#include "leafid/image.hpp"
#include "leafid/image_io.hpp"
#include "leafid/normalization.hpp"
#include "leafid/pipeline.hpp"
#include "leafid/pnn.hpp"
#include "leafid/segmentation.hpp"
#include "leafid/shape_features.hpp"
#include "leafid/texture_features.hpp"
#include "leafid/vein_features.hpp"
