#pragma once

#include <flowsat/certificate.hpp>
#include <flowsat/decode.hpp>
#include <flowsat/formula.hpp>
#include <flowsat/implication.hpp>
#include <flowsat/lp_model.hpp>
#include <flowsat/lp_solver.hpp>
#include <flowsat/mps.hpp>
#include <flowsat/pipeline.hpp>
#include <flowsat/qn_oracle.hpp>
#include <flowsat/rational.hpp>
