#pragma once

#include "tightcert/errors.hpp"
#include "tightcert/rationals.hpp"
#include "tightcert/contact_diagram.hpp"
#include "tightcert/smooth_topology.hpp"
#include "tightcert/floer_engine.hpp"
#include "tightcert/contact_certifier.hpp"
#include "tightcert/io.hpp"
