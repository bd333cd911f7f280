#pragma once

#include "fraclab/birman_schwinger.hpp"
#include "fraclab/core_math.hpp"
#include "fraclab/discretization.hpp"
#include "fraclab/green.hpp"
#include "fraclab/io.hpp"
#include "fraclab/point_interaction.hpp"
#include "fraclab/quadrature.hpp"
#include "fraclab/resonance_builder.hpp"
#include "fraclab/shrinking_limit.hpp"
#include "fraclab/version.hpp"
