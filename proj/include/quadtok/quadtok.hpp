#pragma once

#include "quadtok/conditional.hpp"
#include "quadtok/error.hpp"
#include "quadtok/image_io.hpp"
#include "quadtok/layout.hpp"
#include "quadtok/overlay.hpp"
#include "quadtok/pipeline.hpp"
#include "quadtok/quadtree.hpp"
#include "quadtok/raster.hpp"
#include "quadtok/record.hpp"
#include "quadtok/sweep.hpp"
#include "quadtok/synth.hpp"
#include "quadtok/tokens.hpp"
