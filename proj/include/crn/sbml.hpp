#pragma once

#include <string>
#include <string_view>

#include "crn/model.hpp"

namespace crn {

/// SBML Level 3 Version 1 core: one compartment `cell` of size 1, species as
/// substance amounts (hasOnlySubstanceUnits="true"), irreversible reactions
/// whose kineticLaw is k * prod X^a with k as the local parameter.
/// Empty ListOf elements are omitted, since L3V1 forbids them.
/// Output bytes depend only on the network.
std::string export_sbml(const ReactionNetwork& network);

/// Reads the subset written by export_sbml. Anything else raises
/// UnsupportedSbmlFeatureError naming the feature.
ReactionNetwork import_sbml_subset(std::string_view xml);

}  // namespace crn
