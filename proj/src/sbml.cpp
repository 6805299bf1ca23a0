#include "crn/sbml.hpp"

#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "crn/errors.hpp"
#include "crn/numfmt.hpp"

namespace crn {
namespace {

using boost::property_tree::ptree;

constexpr const char* kCompartment = "cell";

std::string unique_id(const std::string& wanted, const std::set<std::string>& taken) {
  std::string id = wanted;
  while (taken.count(id)) id = "R_" + id;
  return id;
}

void write_references(std::string& out, const char* list, const ReactionNetwork& network,
                      const std::vector<ReactionTerm>& terms) {
  if (terms.empty()) return;
  out += std::string("        <") + list + ">\n";
  for (const auto& t : terms) {
    out += "          <speciesReference species=\"" + network.species[t.species].name + "\" stoichiometry=\"" +
           std::to_string(t.coefficient) + "\" constant=\"true\"/>\n";
  }
  out += std::string("        </") + list + ">\n";
}

std::string rate_parameter_id(const ReactionNetwork& network, const Reaction& reaction) {
  std::string id = "k";
  auto clashes = [&](const std::string& candidate) {
    for (const auto& t : reaction.reactants)
      if (network.species[t.species].name == candidate) return true;
    return false;
  };
  while (clashes(id)) id += "_";
  return id;
}

void write_math(std::string& out, const ReactionNetwork& network, const Reaction& reaction, const std::string& k_id) {
  const std::string indent = "            ";
  out += "          <math xmlns=\"http://www.w3.org/1998/Math/MathML\">\n";
  if (reaction.reactants.empty()) {
    out += indent + "<ci> " + k_id + " </ci>\n";
  } else {
    out += indent + "<apply>\n";
    out += indent + "  <times/>\n";
    out += indent + "  <ci> " + k_id + " </ci>\n";
    for (const auto& t : reaction.reactants) {
      const std::string& name = network.species[t.species].name;
      if (t.coefficient == 1) {
        out += indent + "  <ci> " + name + " </ci>\n";
      } else {
        out += indent + "  <apply>\n";
        out += indent + "    <power/>\n";
        out += indent + "    <ci> " + name + " </ci>\n";
        out += indent + "    <cn type=\"integer\"> " + std::to_string(t.coefficient) + " </cn>\n";
        out += indent + "  </apply>\n";
      }
    }
    out += indent + "</apply>\n";
  }
  out += "          </math>\n";
}

// ---------------------------------------------------------------------------
// Import

std::string trimmed(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  return s.substr(first, s.find_last_not_of(" \t\r\n") - first + 1);
}

std::optional<std::string> attr(const ptree& node, const std::string& name) {
  if (auto v = node.get_optional<std::string>("<xmlattr>." + name)) return *v;
  return std::nullopt;
}

std::string require_attr(const ptree& node, const std::string& element, const std::string& name) {
  auto v = attr(node, name);
  if (!v) throw UnsupportedSbmlFeatureError(element + " without " + name);
  return *v;
}

double require_number(const ptree& node, const std::string& element, const std::string& name) {
  const auto text = require_attr(node, element, name);
  const auto value = parse_double(text);
  if (!value) throw UnsupportedSbmlFeatureError(element + " " + name + "=\"" + text + "\"");
  return *value;
}

bool is_meta(const std::string& key) { return key == "<xmlattr>" || key == "<xmlcomment>"; }

bool is_ignorable(const std::string& key) { return is_meta(key) || key == "notes" || key == "annotation"; }

void reject_unknown_children(const ptree& node, std::initializer_list<const char*> allowed) {
  for (const auto& [key, child] : node) {
    if (is_ignorable(key)) continue;
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw UnsupportedSbmlFeatureError(key);
  }
}

bool attr_is(const ptree& node, const std::string& name, const std::string& expected) {
  auto v = attr(node, name);
  return v && *v == expected;
}

// Mass-action factors of a kineticLaw: the parameter id and species exponents.
struct PowerLaw {
  std::vector<std::string> identifiers;
  std::map<std::string, int> exponents;
};

void collect_factor(const std::string& key, const ptree& node, PowerLaw& law) {
  if (key == "ci") {
    law.identifiers.push_back(trimmed(node.data()));
    return;
  }
  if (key == "apply") {
    std::vector<std::pair<std::string, const ptree*>> parts;
    for (const auto& [k, child] : node)
      if (!is_meta(k)) parts.emplace_back(k, &child);
    if (parts.size() == 3 && parts[0].first == "power" && parts[1].first == "ci" && parts[2].first == "cn") {
      const std::string name = trimmed(parts[1].second->data());
      const auto exponent = parse_double(trimmed(parts[2].second->data()));
      if (!exponent || *exponent < 1 || *exponent != static_cast<int>(*exponent))
        throw UnsupportedSbmlFeatureError("kineticLaw with non-integer exponent");
      law.exponents[name] += static_cast<int>(*exponent);
      return;
    }
  }
  throw UnsupportedSbmlFeatureError("kineticLaw MathML element '" + key + "' outside mass-action form");
}

PowerLaw read_power_law(const ptree& math) {
  PowerLaw law;
  std::vector<std::pair<std::string, const ptree*>> top;
  for (const auto& [k, child] : math)
    if (!is_meta(k)) top.emplace_back(k, &child);
  if (top.size() != 1) throw UnsupportedSbmlFeatureError("kineticLaw MathML with several top-level expressions");
  const auto& [key, node] = top.front();
  if (key == "apply") {
    auto it = node->begin();
    while (it != node->end() && is_meta(it->first)) ++it;
    if (it != node->end() && it->first == "times") {
      for (++it; it != node->end(); ++it)
        if (!is_meta(it->first)) collect_factor(it->first, it->second, law);
      return law;
    }
  }
  collect_factor(key, *node, law);
  return law;
}

std::vector<ReactionTerm> read_references(const ptree& reaction, const char* list, const ReactionNetwork& network,
                                          const std::string& reaction_id) {
  std::vector<ReactionTerm> terms;
  auto node = reaction.get_child_optional(list);
  if (!node) return terms;
  reject_unknown_children(*node, {"speciesReference"});
  for (const auto& [key, ref] : *node) {
    if (key != "speciesReference") continue;
    const std::string species = require_attr(ref, "speciesReference", "species");
    const auto idx = network.find_species(species);
    if (!idx) throw UnsupportedSbmlFeatureError("reference to unknown species '" + species + "' in " + reaction_id);
    const double stoich = require_number(ref, "speciesReference", "stoichiometry");
    if (stoich < 1 || stoich != static_cast<int>(stoich))
      throw UnsupportedSbmlFeatureError("non-integer stoichiometry in " + reaction_id);
    if (!attr_is(ref, "constant", "true")) throw UnsupportedSbmlFeatureError("variable stoichiometry");
    auto existing = std::find_if(terms.begin(), terms.end(), [&](const ReactionTerm& t) { return t.species == *idx; });
    if (existing != terms.end()) {
      existing->coefficient += static_cast<int>(stoich);
    } else {
      terms.push_back({*idx, static_cast<int>(stoich)});
    }
  }
  return terms;
}

}  // namespace

std::string export_sbml(const ReactionNetwork& network) {
  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<sbml xmlns=\"http://www.sbml.org/sbml/level3/version1/core\" level=\"3\" version=\"1\">\n";
  out += "  <model id=\"crn_model\" name=\"crn_model\" substanceUnits=\"item\" timeUnits=\"second\" "
         "extentUnits=\"item\">\n";
  out += "    <listOfCompartments>\n";
  out += std::string("      <compartment id=\"") + kCompartment + "\" name=\"" + kCompartment +
         "\" spatialDimensions=\"3\" size=\"1\" constant=\"true\"/>\n";
  out += "    </listOfCompartments>\n";

  std::set<std::string> taken = {kCompartment, "crn_model"};
  if (!network.species.empty()) {
    out += "    <listOfSpecies>\n";
    for (const auto& s : network.species) {
      taken.insert(s.name);
      out += "      <species id=\"" + s.name + "\" name=\"" + s.name + "\" compartment=\"" + kCompartment +
             "\" initialAmount=\"" + format_double(s.initial_amount) +
             "\" hasOnlySubstanceUnits=\"true\" boundaryCondition=\"false\" constant=\"false\"/>\n";
    }
    out += "    </listOfSpecies>\n";
  }

  if (!network.reactions.empty()) {
    out += "    <listOfReactions>\n";
    for (const auto& r : network.reactions) {
      const std::string id = unique_id(r.name, taken);
      taken.insert(id);
      const std::string k_id = rate_parameter_id(network, r);
      out += "      <reaction id=\"" + id + "\" name=\"" + r.name + "\" reversible=\"false\" fast=\"false\">\n";
      write_references(out, "listOfReactants", network, r.reactants);
      write_references(out, "listOfProducts", network, r.products);
      out += "        <kineticLaw>\n";
      write_math(out, network, r, k_id);
      out += "          <listOfLocalParameters>\n";
      out += "            <localParameter id=\"" + k_id + "\" value=\"" + format_double(r.rate_constant) +
             "\"/>\n";
      out += "          </listOfLocalParameters>\n";
      out += "        </kineticLaw>\n";
      out += "      </reaction>\n";
    }
    out += "    </listOfReactions>\n";
  }
  out += "  </model>\n";
  out += "</sbml>\n";
  return out;
}

ReactionNetwork import_sbml_subset(std::string_view xml) {
  ptree doc;
  try {
    std::istringstream in{std::string(xml)};
    boost::property_tree::read_xml(in, doc);
  } catch (const boost::property_tree::xml_parser_error& e) {
    throw Error(std::string("malformed XML: ") + e.what());
  }
  const auto sbml = doc.get_child_optional("sbml");
  if (!sbml) throw UnsupportedSbmlFeatureError("document without <sbml> root");
  if (!attr_is(*sbml, "level", "3") || !attr_is(*sbml, "version", "1"))
    throw UnsupportedSbmlFeatureError("SBML level/version other than 3/1");
  reject_unknown_children(*sbml, {"model"});
  const auto model = sbml->get_child_optional("model");
  if (!model) throw UnsupportedSbmlFeatureError("document without <model>");
  reject_unknown_children(*model, {"listOfCompartments", "listOfSpecies", "listOfReactions"});

  if (auto comps = model->get_child_optional("listOfCompartments")) {
    reject_unknown_children(*comps, {"compartment"});
    if (comps->count("compartment") > 1) throw UnsupportedSbmlFeatureError("multiple compartments");
    for (const auto& [key, c] : *comps) {
      if (key != "compartment") continue;
      if (attr(c, "size") && require_number(c, "compartment", "size") != 1.0)
        throw UnsupportedSbmlFeatureError("compartment size other than 1");
    }
  }

  ReactionNetwork network;
  if (auto species = model->get_child_optional("listOfSpecies")) {
    reject_unknown_children(*species, {"species"});
    for (const auto& [key, s] : *species) {
      if (key != "species") continue;
      if (attr(s, "initialConcentration")) throw UnsupportedSbmlFeatureError("initialConcentration");
      if (!attr_is(s, "hasOnlySubstanceUnits", "true")) throw UnsupportedSbmlFeatureError("concentration species");
      if (attr_is(s, "boundaryCondition", "true")) throw UnsupportedSbmlFeatureError("boundaryCondition");
      if (attr_is(s, "constant", "true")) throw UnsupportedSbmlFeatureError("constant species");
      const std::string id = require_attr(s, "species", "id");
      if (network.find_species(id)) throw DuplicateNameError(id);
      network.species.push_back({id, require_number(s, "species", "initialAmount")});
    }
  }

  if (auto reactions = model->get_child_optional("listOfReactions")) {
    reject_unknown_children(*reactions, {"reaction"});
    for (const auto& [key, r] : *reactions) {
      if (key != "reaction") continue;
      const std::string id = require_attr(r, "reaction", "id");
      if (attr_is(r, "reversible", "true")) throw UnsupportedSbmlFeatureError("reversible");
      if (attr_is(r, "fast", "true")) throw UnsupportedSbmlFeatureError("fast");
      reject_unknown_children(r, {"listOfReactants", "listOfProducts", "kineticLaw"});

      Reaction reaction;
      reaction.name = attr(r, "name").value_or(id);
      reaction.reactants = read_references(r, "listOfReactants", network, id);
      reaction.products = read_references(r, "listOfProducts", network, id);

      const auto law = r.get_child_optional("kineticLaw");
      if (!law) throw UnsupportedSbmlFeatureError("reaction without kineticLaw");
      reject_unknown_children(*law, {"math", "listOfLocalParameters"});
      const auto params = law->get_child_optional("listOfLocalParameters");
      if (!params || params->count("localParameter") != 1)
        throw UnsupportedSbmlFeatureError("kineticLaw without exactly one local parameter");
      reject_unknown_children(*params, {"localParameter"});
      const ptree& param = params->get_child("localParameter");
      const std::string k_id = require_attr(param, "localParameter", "id");
      reaction.rate_constant = require_number(param, "localParameter", "value");
      if (reaction.rate_constant < 0.0) throw NegativeRateError(reaction.name);

      const auto math = law->get_child_optional("math");
      if (!math) throw UnsupportedSbmlFeatureError("kineticLaw without math");
      PowerLaw power = read_power_law(*math);
      std::map<std::string, int> expected;
      for (const auto& t : reaction.reactants) expected[network.species[t.species].name] += t.coefficient;
      std::vector<std::string> idents;
      bool has_k = false;
      for (const auto& name : power.identifiers) {
        if (name == k_id && !has_k) {
          has_k = true;
        } else {
          power.exponents[name] += 1;
        }
      }
      if (!has_k || power.exponents != expected)
        throw UnsupportedSbmlFeatureError("kineticLaw of " + id + " is not mass action in its reactants");

      if (network.find_reaction(reaction.name)) throw DuplicateNameError(reaction.name);
      network.reactions.push_back(std::move(reaction));
    }
  }
  return network;
}

}  // namespace crn
