#ifndef LHOM_IO_REPORT_HPP
#define LHOM_IO_REPORT_HPP

#include <string>
#include <vector>

#include "json.hpp"

#include "lhom/ensembles.hpp"
#include "lhom/experiments.hpp"
#include "lhom/green.hpp"

namespace lhom::io {

using json = nlohmann::ordered_json;

/// JSON text with every floating-point value printed to 17 significant digits.
/// Non-finite numbers become null.
std::string dump_json(const json& value, int indent = 2);

/// 17-significant-digit decimal form used in JSON and CSV output.
std::string format_double(double v);

json to_json(const MomentReport& r);
json to_json(const VarianceReport& r);
json to_json(const SGReport& r);
json to_json(const SGPCheck& r);
json to_json(const DecayReport& r);
json to_json(const MixedBoundsReport& r);
json to_json(const HomogenizedMatrix& h);
json to_json(const SampleChecks& c);
json to_json(const StationarityTable& t);

/// Comma-separated table with a header row.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);
  void add_row(const std::vector<double>& row);
  std::string str() const;
  bool empty() const { return rows_.empty(); }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<double>> rows_;
};

CsvTable to_csv(const VarianceReport& r);
CsvTable to_csv(const SGReport& r);
CsvTable to_csv(const DecayReport& r);

}  // namespace lhom::io

#endif  // LHOM_IO_REPORT_HPP
