#pragma once

#include "altnet/common.hpp"
#include "altnet/network.hpp"
#include "altnet/linalg.hpp"
#include "altnet/arc_state.hpp"
#include "altnet/flow_solver.hpp"
#include "altnet/alt_network.hpp"
#include "altnet/walk.hpp"
#include "altnet/generators.hpp"
#include "altnet/oracle.hpp"
