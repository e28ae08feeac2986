#pragma once

#include "heatchroma/advisor.hpp"
#include "heatchroma/chromatic.hpp"
#include "heatchroma/classifier.hpp"
#include "heatchroma/config.hpp"
#include "heatchroma/detector.hpp"
#include "heatchroma/error.hpp"
#include "heatchroma/io.hpp"
#include "heatchroma/kinds.hpp"
#include "heatchroma/pipeline.hpp"
#include "heatchroma/scenario.hpp"
#include "heatchroma/signal.hpp"
