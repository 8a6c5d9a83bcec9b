#pragma once

#include "pqvrf/bytes.hpp"
#include "pqvrf/complexity.hpp"
#include "pqvrf/config.hpp"
#include "pqvrf/delegation.hpp"
#include "pqvrf/dleq.hpp"
#include "pqvrf/group.hpp"
#include "pqvrf/journal.hpp"
#include "pqvrf/keccak.hpp"
#include "pqvrf/ledger.hpp"
#include "pqvrf/ledger_node.hpp"
#include "pqvrf/pke.hpp"
#include "pqvrf/random.hpp"
#include "pqvrf/ring_signature.hpp"
#include "pqvrf/rlwe/rlwe.hpp"
#include "pqvrf/stats/entropy.hpp"
#include "pqvrf/stats/nist.hpp"
#include "pqvrf/stats/suite.hpp"
#include "pqvrf/vrf.hpp"
#include "pqvrf/worker.hpp"
