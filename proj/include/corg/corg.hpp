#ifndef CORG_CORG_HPP
#define CORG_CORG_HPP

#include "corg/clausify.hpp"
#include "corg/copa.hpp"
#include "corg/embeddings.hpp"
#include "corg/error.hpp"
#include "corg/fol.hpp"
#include "corg/io.hpp"
#include "corg/kg_store.hpp"
#include "corg/model_builder.hpp"
#include "corg/pipeline.hpp"
#include "corg/scorer.hpp"
#include "corg/selection.hpp"
#include "corg/tptp.hpp"
#include "corg/translate.hpp"

#endif  // CORG_CORG_HPP
