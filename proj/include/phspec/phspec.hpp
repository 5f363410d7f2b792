// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "phspec/asymptotics.hpp"
#include "phspec/contour.hpp"
#include "phspec/csv.hpp"
#include "phspec/diagnostics.hpp"
#include "phspec/eigensolver.hpp"
#include "phspec/error.hpp"
#include "phspec/fourier.hpp"
#include "phspec/frobenius.hpp"
#include "phspec/manifest.hpp"
#include "phspec/ode.hpp"
#include "phspec/parallel.hpp"
#include "phspec/problem.hpp"
#include "phspec/shooting.hpp"
#include "phspec/version.hpp"
