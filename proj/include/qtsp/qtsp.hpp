#pragma once

/// Convenience umbrella header.

#include <qtsp/bench.hpp>
#include <qtsp/exact.hpp>
#include <qtsp/ga.hpp>
#include <qtsp/qga.hpp>
#include <qtsp/tsplib.hpp>
