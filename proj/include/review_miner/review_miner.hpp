#pragma once

#include "review_miner/analysis.hpp"
#include "review_miner/classifier.hpp"
#include "review_miner/config.hpp"
#include "review_miner/corpus.hpp"
#include "review_miner/digest.hpp"
#include "review_miner/error.hpp"
#include "review_miner/keywords.hpp"
#include "review_miner/lemmatizer.hpp"
#include "review_miner/pipeline.hpp"
#include "review_miner/random.hpp"
#include "review_miner/report.hpp"
#include "review_miner/synthetic.hpp"
#include "review_miner/syntax.hpp"
#include "review_miner/text.hpp"
#include "review_miner/textproc.hpp"
#include "review_miner/types.hpp"
