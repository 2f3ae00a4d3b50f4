#pragma once

#include "gtp/adversary.hpp"
#include "gtp/thm1.hpp"
#include "gtp/thm3.hpp"
#include "gtp/upprob.hpp"
