#pragma once

#include "form_algebra.hpp"
#include "serialize.hpp"
#include "simplicial.hpp"
#include "generator.hpp"
#include "evaluator.hpp"
#include "quadrature.hpp"
#include "brylinski.hpp"
#include "suites.hpp"
