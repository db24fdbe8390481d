#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <utility>

#include "transitfit/csv.hpp"
#include "transitfit/types.hpp"

namespace transitfit {

/// Maps logical field names to the column headers of a particular export
/// vintage. Defaults map every logical name to itself.
class Schema {
 public:
  Schema();

  const std::string& header_for(const std::string& logical) const;
  void set(const std::string& logical, const std::string& header);

  /// Loads `logical=header` lines; '#' starts a comment. Unknown logical
  /// names are rejected.
  static Schema load(const std::string& path);

  const std::map<std::string, std::string>& mapping() const { return map_; }

 private:
  std::map<std::string, std::string> map_;
};

struct ParseOptions {
  char delimiter = ',';
  int min_year = 2002;
  int max_year = 2018;
};

struct ParseResult {
  std::vector<AgencyYearRecord> records;
  ExclusionReport report;
};

/// Parses agency-year records from a delimited table. Malformed numeric
/// cells become missing fields (noted in the report); rows with a bad or
/// out-of-range year are dropped. Row order is preserved.
ParseResult parse_dataset(std::istream& source, const Schema& schema,
                          const ParseOptions& options = {});
ParseResult parse_dataset_file(const std::string& path, const Schema& schema,
                               const ParseOptions& options = {});

/// Computes sad, acpt and afpt. Missing or degenerate inputs (zero trips,
/// nonpositive area) yield missing outputs, never errors.
DerivedRecord derive_variables(const AgencyYearRecord& record);

Dataset derive_all(const std::vector<AgencyYearRecord>& records);

/// Serializes records in the same delimited schema parse_dataset reads.
/// Doubles use shortest round-trip formatting, so write/parse is lossless.
void write_dataset(std::ostream& out, const Dataset& records, const Schema& schema,
                   char delimiter = ',');
void write_dataset_file(const std::string& path, const Dataset& records,
                        const Schema& schema, char delimiter = ',');

}  // namespace transitfit
