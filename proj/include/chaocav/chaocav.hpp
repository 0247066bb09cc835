#pragma once

#include "chaocav/dynamics.hpp"
#include "chaocav/entanglement.hpp"
#include "chaocav/errors.hpp"
#include "chaocav/field.hpp"
#include "chaocav/linalg.hpp"
#include "chaocav/oracle.hpp"
#include "chaocav/parallel.hpp"
#include "chaocav/teleportation.hpp"
