// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace sntail::cli {

using Cell = std::variant<std::monostate, std::int64_t, std::uint64_t, double, bool, std::string>;

/// Rows of one result kind with a fixed column order.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row);
};

enum class Status { confirmed, discrepant, untested };

/// One comparison of a printed constant against its corrected value and an
/// independent oracle. Ratios are taken against the oracle when it exists,
/// otherwise against the corrected value.
struct LedgerEntry {
  std::string quantity;
  std::optional<double> paper;
  std::optional<double> corrected;
  std::optional<double> oracle;
  Status status = Status::untested;
  std::string note;

  std::optional<double> paper_ratio() const;
  std::optional<double> corrected_ratio() const;
};

/// Paper and corrected values are compared with the oracle (or with each
/// other when there is no oracle) at relative tolerance `tol`.
/// A discrepancy requires the `paper` value and something to compare it with.
LedgerEntry make_entry(std::string quantity, std::optional<double> paper, std::optional<double> corrected,
                       std::optional<double> oracle, double tol, std::string note = {});

Table ledger_table(const std::vector<LedgerEntry>& entries);

const char* to_string(Status s);

}  // namespace sntail::cli
