#ifndef PROJFEAS_REPLICATE_HPP
#define PROJFEAS_REPLICATE_HPP

#include <string>
#include <string_view>
#include <vector>

namespace projfeas {

struct ReplicationRow {
  std::string entry;
  std::string check;
  std::string detail;
  bool pass = false;
};

/// Runs the catalog checks for one entry id: engine runs against the scalar
/// and closed-form oracles, documented values, and fitted rates.
std::vector<ReplicationRow> replicate(std::string_view id);

/// replicate() over catalog::default_ids(), rows grouped by id.
std::vector<ReplicationRow> replicate_all();

/// Fixed-width table, one line per row, ending in PASS or FAIL.
std::string format_table(const std::vector<ReplicationRow>& rows);

}  // namespace projfeas

#endif  // PROJFEAS_REPLICATE_HPP
