#pragma once

#include <iosfwd>
#include <string>

#include "focuss/analysis.hpp"
#include "focuss/datagen.hpp"
#include "focuss/focuss.hpp"
#include "focuss/model.hpp"

namespace focuss::io {

// Shortest decimal that round-trips to the same binary64 value.
std::string format_double(double v);

std::string dataset_to_json(const GeneratedDataset& dataset);
GeneratedDataset dataset_from_json(const std::string& text);  // throws Error(Schema)

GeneratedDataset read_dataset(const std::string& path);       // throws Error(Io / Schema)
void write_dataset(const std::string& path, const GeneratedDataset& dataset);

void write_trace_csv(std::ostream& out, const SolveTrace& trace);
void write_rate_csv(std::ostream& out, const RateReport& report);

std::string oracle_to_json(const OracleResult& result, double p);

void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

}  // namespace focuss::io
