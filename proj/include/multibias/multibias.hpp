#pragma once

#include "multibias/bias_model.hpp"
#include "multibias/bound.hpp"
#include "multibias/dsl.hpp"
#include "multibias/error.hpp"
#include "multibias/evalue.hpp"
#include "multibias/oracle.hpp"
