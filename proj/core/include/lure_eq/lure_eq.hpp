#pragma once

#include "lure_eq/linalg.hpp"
#include "lure_eq/lipschitz_map.hpp"
#include "lure_eq/log.hpp"
#include "lure_eq/lure.hpp"
#include "lure_eq/lure_system.hpp"
#include "lure_eq/monotone_operator.hpp"
#include "lure_eq/nash.hpp"
#include "lure_eq/qvi.hpp"
#include "lure_eq/resolvent.hpp"
#include "lure_eq/resolvent_calculus.hpp"
#include "lure_eq/splitting.hpp"
