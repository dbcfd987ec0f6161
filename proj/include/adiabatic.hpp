#pragma once

#include "adiabatic/operator_core.hpp"
#include "adiabatic/circuits.hpp"
#include "adiabatic/schedule.hpp"
#include "adiabatic/paths.hpp"
#include "adiabatic/bounds.hpp"
#include "adiabatic/evolution.hpp"
#include "adiabatic/oracle.hpp"
#include "adiabatic/config.hpp"
#include "adiabatic/cli.hpp"
