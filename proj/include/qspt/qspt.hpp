#ifndef QSPT_QSPT_HPP
#define QSPT_QSPT_HPP

#include <qspt/analysis.hpp>
#include <qspt/atomic.hpp>
#include <qspt/dressed.hpp>
#include <qspt/error.hpp>
#include <qspt/ode.hpp>
#include <qspt/propagation.hpp>

#endif
