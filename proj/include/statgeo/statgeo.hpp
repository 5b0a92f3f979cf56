#pragma once

#include "statgeo/frobenius.hpp"
#include "statgeo/geometry.hpp"
#include "statgeo/model.hpp"
#include "statgeo/split_algebra.hpp"
#include "statgeo/toric.hpp"
#include "statgeo/webs.hpp"
