#pragma once

#include "setsp/compression.hpp"
#include "setsp/coverage.hpp"
#include "setsp/filters.hpp"
#include "setsp/io.hpp"
#include "setsp/powerset.hpp"
#include "setsp/random.hpp"
#include "setsp/sampling.hpp"
#include "setsp/transforms.hpp"
