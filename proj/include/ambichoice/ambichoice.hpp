#pragma once

#include "ambichoice/bounds.hpp"
#include "ambichoice/distributions.hpp"
#include "ambichoice/dominance.hpp"
#include "ambichoice/error.hpp"
#include "ambichoice/oracle.hpp"
#include "ambichoice/planner.hpp"
#include "ambichoice/report.hpp"
#include "ambichoice/scenario_io.hpp"
