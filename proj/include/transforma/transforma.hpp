#pragma once

#include "transforma/allocation.hpp"
#include "transforma/economy.hpp"
#include "transforma/error.hpp"
#include "transforma/linalg.hpp"
#include "transforma/matrix.hpp"
#include "transforma/pipeline.hpp"
#include "transforma/price_system.hpp"
#include "transforma/quantity_system.hpp"
#include "transforma/rational.hpp"
#include "transforma/report.hpp"
#include "transforma/scenario.hpp"
#include "transforma/sweep.hpp"
#include "transforma/value_system.hpp"
