#pragma once

// Everything except the CLI layer.

#include "idemfact/certificate_json.hpp"
#include "idemfact/certify.hpp"
#include "idemfact/elemdecomp.hpp"
#include "idemfact/error.hpp"
#include "idemfact/integer.hpp"
#include "idemfact/intlib.hpp"
#include "idemfact/mat2.hpp"
#include "idemfact/omodule.hpp"
#include "idemfact/pipeline.hpp"
#include "idemfact/quadring.hpp"
