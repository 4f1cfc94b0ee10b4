#pragma once

#include "czmech/constitutive.hpp"
#include "czmech/continuum.hpp"
#include "czmech/dynamics.hpp"
#include "czmech/frames.hpp"
#include "czmech/measures.hpp"
#include "czmech/numerics.hpp"
#include "czmech/screw.hpp"
