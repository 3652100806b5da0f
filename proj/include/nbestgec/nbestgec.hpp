#pragma once

#include "nbestgec/alignment.hpp"
#include "nbestgec/confnet.hpp"
#include "nbestgec/corpus_io.hpp"
#include "nbestgec/correction.hpp"
#include "nbestgec/edit_distance.hpp"
#include "nbestgec/error.hpp"
#include "nbestgec/llm_correct.hpp"
#include "nbestgec/nbest_stats.hpp"
#include "nbestgec/ngram_lm.hpp"
#include "nbestgec/normalize.hpp"
#include "nbestgec/oracle.hpp"
#include "nbestgec/parallel.hpp"
#include "nbestgec/prompt.hpp"
#include "nbestgec/report.hpp"
