#pragma once

#include "telliptic/errors.hpp"
#include "telliptic/moebius.hpp"
#include "telliptic/surface.hpp"
#include "telliptic/rep.hpp"
#include "telliptic/chains.hpp"
#include "telliptic/complexify.hpp"
#include "telliptic/verdict.hpp"
#include "telliptic/io.hpp"
