#pragma once

#include "bankdyn/config.hpp"
#include "bankdyn/csv.hpp"
#include "bankdyn/integrator.hpp"
#include "bankdyn/model.hpp"
#include "bankdyn/regulation.hpp"
#include "bankdyn/scenario.hpp"
#include "bankdyn/svg.hpp"
