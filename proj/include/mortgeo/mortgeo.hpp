#pragma once

#include "mortgeo/apc.hpp"
#include "mortgeo/cei.hpp"
#include "mortgeo/common.hpp"
#include "mortgeo/geometry.hpp"
#include "mortgeo/hmd.hpp"
#include "mortgeo/lee_carter.hpp"
#include "mortgeo/mlc.hpp"
#include "mortgeo/surface.hpp"
#include "mortgeo/svg.hpp"
