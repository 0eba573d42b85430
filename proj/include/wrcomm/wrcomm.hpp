#pragma once

// Umbrella header.

#include "wrcomm/bench.hpp"
#include "wrcomm/errors.hpp"
#include "wrcomm/groups.hpp"
#include "wrcomm/oracle.hpp"
#include "wrcomm/signature.hpp"
#include "wrcomm/solver.hpp"
#include "wrcomm/tree_aut.hpp"
#include "wrcomm/wrformat.hpp"
