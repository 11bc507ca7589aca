#pragma once

#include "ann.hpp"
#include "bounds.hpp"
#include "code.hpp"
#include "constructor.hpp"
#include "cs.hpp"
#include "ensembles.hpp"
#include "errors.hpp"
#include "forces.hpp"
#include "packing.hpp"
#include "serialize.hpp"
#include "util.hpp"
