#pragma once

// Library umbrella. cache.hpp and cli.hpp are separate: they also need OpenSSL (target orbiqrr_cli).

#include "errors.hpp"
#include "rational.hpp"
#include "cyclotomic.hpp"
#include "scalar.hpp"
#include "scalar_parse.hpp"
#include "qpoly.hpp"
#include "matrix.hpp"
#include "trunc_series.hpp"
#include "bernoulli.hpp"
#include "target.hpp"
#include "builtin.hpp"
#include "target_io.hpp"
#include "givental.hpp"
#include "loopops.hpp"
#include "correlators.hpp"
#include "genus0.hpp"
#include "fock.hpp"
#include "serre.hpp"
#include "report.hpp"
