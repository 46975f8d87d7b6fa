#pragma once

#include "rigidnet/ais.hpp"
#include "rigidnet/errors.hpp"
#include "rigidnet/formation.hpp"
#include "rigidnet/framework.hpp"
#include "rigidnet/geometry.hpp"
#include "rigidnet/graph.hpp"
#include "rigidnet/laman.hpp"
#include "rigidnet/localization.hpp"
#include "rigidnet/numerics.hpp"
#include "rigidnet/random.hpp"
#include "rigidnet/rigidity.hpp"
#include "rigidnet/serialization.hpp"
