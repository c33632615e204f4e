#pragma once

#include "assign.hpp"
#include "batch.hpp"
#include "case.hpp"
#include "config.hpp"
#include "core.hpp"
#include "cut.hpp"
#include "evaluate.hpp"
#include "geom.hpp"
#include "imaging.hpp"
#include "io.hpp"
#include "pipeline.hpp"
#include "select.hpp"
#include "synth.hpp"
#include "vccut.hpp"
#include "vvcut.hpp"
