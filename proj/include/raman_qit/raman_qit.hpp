#pragma once

#include "raman_qit/errors.hpp"
#include "raman_qit/hilbert.hpp"
#include "raman_qit/atomfield.hpp"
#include "raman_qit/protocol.hpp"
