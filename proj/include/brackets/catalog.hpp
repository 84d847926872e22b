#pragma once

#include <string>
#include <vector>

#include "brackets/series_rep.hpp"

namespace brackets {

// Argument conventions: exp(x) stands for e^{-x} and Ei(x) for Ei(-x); every other
// name is the usual function of x.
struct CatalogEntry {
  std::string name;
  std::vector<std::string> parameters;  // placeholders such as "%nu", bound by catalog_lookup
  std::vector<SeriesRep> reps;

  const SeriesRep& rep(const std::string& repName) const;
  // Ways to expand the function: each choice is a list of reps whose series add up to it.
  // Most reps stand alone; TricomiU's U1 and U2 are the two halves of one expansion.
  std::vector<std::vector<std::string>> choices() const;
};

// "U1+U2" style names select several summand reps at once.
std::vector<std::string> split_choice(const std::string& choice);

bool operator==(const CatalogEntry& a, const CatalogEntry& b);

const std::vector<CatalogEntry>& builtin_catalog();

// "pFq" style names ("2F1", "1F0", ...) are recognized with p upper and q lower
// literal parameters passed in order as bindings.
bool parse_hypergeometric_name(const std::string& name, int& p, int& q);

CatalogEntry catalog_lookup(const std::string& name, const std::vector<AffineForm>& bindings);

std::string serialize_catalog(const std::vector<CatalogEntry>& entries);
std::vector<CatalogEntry> parse_catalog(const std::string& text);

}  // namespace brackets
