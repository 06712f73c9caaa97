// SPDX-License-Identifier: Apache-2.0
#include "sntail/cli/ledger.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace sntail::cli {

void Table::add(std::vector<Cell> row) {
  if (row.size() != columns.size()) throw std::logic_error("Table::add: row width does not match the header");
  rows.push_back(std::move(row));
}

namespace {

std::optional<double> ratio(std::optional<double> num, std::optional<double> den) {
  if (!num || !den || *den == 0.0) return std::nullopt;
  return *num / *den;
}

bool agrees(double a, double b, double tol) {
  if (a == b) return true;
  return std::fabs(a - b) <= tol * std::max(std::fabs(a), std::fabs(b));
}

Cell opt(std::optional<double> x) { return x ? Cell{*x} : Cell{}; }

}  // namespace

std::optional<double> LedgerEntry::paper_ratio() const { return ratio(paper, oracle ? oracle : corrected); }

std::optional<double> LedgerEntry::corrected_ratio() const { return ratio(corrected, oracle); }

LedgerEntry make_entry(std::string quantity, std::optional<double> paper, std::optional<double> corrected,
                       std::optional<double> oracle, double tol, std::string note) {
  LedgerEntry e{std::move(quantity), paper, corrected, oracle, Status::untested, std::move(note)};
  const std::optional<double> reference = oracle ? oracle : corrected;
  if (paper && reference) {
    e.status = agrees(*paper, *reference, tol) ? Status::confirmed : Status::discrepant;
  } else if (corrected && oracle) {
    e.status = agrees(*corrected, *oracle, tol) ? Status::confirmed : Status::discrepant;
  }
  return e;
}

Table ledger_table(const std::vector<LedgerEntry>& entries) {
  Table t{{"quantity", "paper", "corrected", "oracle", "paper_ratio", "corrected_ratio", "status", "note"}, {}};
  for (const auto& e : entries) {
    t.add({e.quantity, opt(e.paper), opt(e.corrected), opt(e.oracle), opt(e.paper_ratio()),
           opt(e.corrected_ratio()), std::string(to_string(e.status)), e.note});
  }
  return t;
}

const char* to_string(Status s) {
  switch (s) {
    case Status::confirmed:
      return "confirmed";
    case Status::discrepant:
      return "discrepant";
    case Status::untested:
      return "untested";
  }
  return "?";
}

}  // namespace sntail::cli
