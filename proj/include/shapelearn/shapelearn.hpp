#pragma once

#include "shapelearn/descriptors.hpp"
#include "shapelearn/error.hpp"
#include "shapelearn/geometry.hpp"
#include "shapelearn/learner.hpp"
#include "shapelearn/metrics.hpp"
#include "shapelearn/polygon_gen.hpp"
#include "shapelearn/random.hpp"
#include "shapelearn/templates.hpp"
