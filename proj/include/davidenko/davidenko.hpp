#ifndef DAVIDENKO_DAVIDENKO_HPP
#define DAVIDENKO_DAVIDENKO_HPP

#include "davidenko/config.hpp"
#include "davidenko/core.hpp"
#include "davidenko/domain.hpp"
#include "davidenko/fd.hpp"
#include "davidenko/flow.hpp"
#include "davidenko/frontends.hpp"
#include "davidenko/io.hpp"
#include "davidenko/oracles.hpp"
#include "davidenko/problem.hpp"
#include "davidenko/registry.hpp"
#include "davidenko/right_inverse.hpp"

#endif
