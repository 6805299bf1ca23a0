#include <cmath>
#include <regex>
#include <unordered_set>

#include <json.hpp>

#include "crn/dsl.hpp"
#include "crn/errors.hpp"

namespace crn {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

bool valid_identifier(const std::string& name) {
  static const std::regex pattern("[A-Za-z_][A-Za-z0-9_]*");
  return std::regex_match(name, pattern);
}

void warn_unknown(const json& object, std::initializer_list<const char*> known, const std::string& path,
                  std::vector<ParseNote>* notes) {
  if (!notes) return;
  for (const auto& [key, value] : object.items()) {
    bool found = false;
    for (const char* k : known) found = found || key == k;
    if (!found) notes->push_back({path + "/" + key, "unknown field ignored"});
  }
}

const json& require(const json& object, const char* key, const std::string& path) {
  auto it = object.find(key);
  if (it == object.end()) throw SchemaError(path + "/" + key, "missing required field");
  return *it;
}

std::string require_name(const json& object, const std::string& path) {
  const json& name = require(object, "name", path);
  if (!name.is_string()) throw SchemaError(path + "/name", "expected a string");
  const auto value = name.get<std::string>();
  if (!valid_identifier(value)) throw SchemaError(path + "/name", "'" + value + "' is not a valid identifier");
  return value;
}

double require_number(const json& object, const char* key, const std::string& path) {
  const json& value = require(object, key, path);
  if (!value.is_number()) throw SchemaError(path + "/" + key, "expected a number");
  const double v = value.get<double>();
  if (!std::isfinite(v)) throw SchemaError(path + "/" + key, "expected a finite number");
  return v;
}

std::vector<ReactionTerm> parse_terms(const json& side, const std::string& path, const ReactionNetwork& network,
                                      std::vector<ParseNote>* notes) {
  if (!side.is_array()) throw SchemaError(path, "expected an array");
  std::vector<ReactionTerm> terms;
  for (std::size_t i = 0; i < side.size(); ++i) {
    const std::string item_path = path + "/" + std::to_string(i);
    const json& item = side[i];
    if (!item.is_object()) throw SchemaError(item_path, "expected an object");
    warn_unknown(item, {"species", "coefficient"}, item_path, notes);
    const json& species = require(item, "species", item_path);
    if (!species.is_string()) throw SchemaError(item_path + "/species", "expected a string");
    const auto idx = network.find_species(species.get<std::string>());
    if (!idx)
      throw SchemaError(item_path + "/species", "undeclared species '" + species.get<std::string>() + "'");
    int coefficient = 1;
    if (auto it = item.find("coefficient"); it != item.end()) {
      if (!it->is_number_integer() || it->get<std::int64_t>() < 1 || it->get<std::int64_t>() > 1000000)
        throw SchemaError(item_path + "/coefficient", "expected a positive integer");
      coefficient = it->get<int>();
    }
    auto existing = std::find_if(terms.begin(), terms.end(), [&](const ReactionTerm& t) { return t.species == *idx; });
    if (existing != terms.end()) {
      existing->coefficient += coefficient;
    } else {
      terms.push_back({*idx, coefficient});
    }
  }
  return terms;
}

ordered_json terms_to_json(const ReactionNetwork& network, const std::vector<ReactionTerm>& terms) {
  ordered_json out = ordered_json::array();
  for (const auto& t : terms) {
    ordered_json item;
    item["species"] = network.species[t.species].name;
    item["coefficient"] = t.coefficient;
    out.push_back(std::move(item));
  }
  return out;
}

}  // namespace

ReactionNetwork parse_kinetic_table(std::string_view text, std::vector<ParseNote>* notes) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw SchemaError("", std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw SchemaError("", "expected an object");
  warn_unknown(doc, {"species", "reactions"}, "", notes);

  ReactionNetwork network;
  const json& species = require(doc, "species", "");
  if (!species.is_array()) throw SchemaError("/species", "expected an array");
  for (std::size_t i = 0; i < species.size(); ++i) {
    const std::string path = "/species/" + std::to_string(i);
    if (!species[i].is_object()) throw SchemaError(path, "expected an object");
    warn_unknown(species[i], {"name", "initial_amount"}, path, notes);
    Species s;
    s.name = require_name(species[i], path);
    s.initial_amount = require_number(species[i], "initial_amount", path);
    if (s.initial_amount < 0.0) throw SchemaError(path + "/initial_amount", "must be non-negative");
    if (network.find_species(s.name)) throw DuplicateNameError(s.name);
    network.species.push_back(std::move(s));
  }

  const json& reactions = require(doc, "reactions", "");
  if (!reactions.is_array()) throw SchemaError("/reactions", "expected an array");
  for (std::size_t i = 0; i < reactions.size(); ++i) {
    const std::string path = "/reactions/" + std::to_string(i);
    const json& item = reactions[i];
    if (!item.is_object()) throw SchemaError(path, "expected an object");
    warn_unknown(item, {"name", "reactants", "products", "rate_constant"}, path, notes);
    Reaction r;
    r.name = require_name(item, path);
    r.reactants = parse_terms(require(item, "reactants", path), path + "/reactants", network, notes);
    r.products = parse_terms(require(item, "products", path), path + "/products", network, notes);
    r.rate_constant = require_number(item, "rate_constant", path);
    if (r.rate_constant < 0.0) throw NegativeRateError(r.name);
    if (network.find_reaction(r.name)) throw DuplicateNameError(r.name);
    network.reactions.push_back(std::move(r));
  }
  return network;
}

std::string emit_kinetic_table(const ReactionNetwork& network) {
  ordered_json doc;
  doc["species"] = ordered_json::array();
  for (const auto& s : network.species) {
    ordered_json item;
    item["name"] = s.name;
    item["initial_amount"] = s.initial_amount;
    doc["species"].push_back(std::move(item));
  }
  doc["reactions"] = ordered_json::array();
  for (const auto& r : network.reactions) {
    ordered_json item;
    item["name"] = r.name;
    item["reactants"] = terms_to_json(network, r.reactants);
    item["products"] = terms_to_json(network, r.products);
    item["rate_constant"] = r.rate_constant;
    doc["reactions"].push_back(std::move(item));
  }
  return doc.dump(2) + "\n";
}

}  // namespace crn
