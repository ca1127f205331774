#pragma once

// everything: model, decomposition, Frobenius lifts, connections, generators, JSON documents
#include "drw/connections.hpp"
#include "drw/decomposition.hpp"
#include "drw/frobenius_lifts.hpp"
#include "drw/generate.hpp"
#include "drw/model.hpp"
#include "drw/serialize.hpp"
