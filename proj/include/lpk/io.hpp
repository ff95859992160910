#pragma once
// File serialization for the math objects: signals and vector signals as CSV,
// interval families as JSON, covers and maximal profiles as CSV.
//
// All floating-point text uses the shortest round-trip form, so re-emitting
// unchanged data is byte-identical. Read errors and malformed content throw
// std::runtime_error naming the path.

#include <string>

#include "lpk/campanato.hpp"
#include "lpk/cover.hpp"
#include "lpk/signal.hpp"

namespace lpk {

// Shortest decimal form that parses back to exactly the same double.
std::string fmt_double(double x);

// Signal CSV: "# T=<period> N=<size>" comment, "index,real,imag" header, one
// row per sample.
void write_signal_csv(const std::string& path, const SampledSignal& f);
SampledSignal read_signal_csv(const std::string& path);

// Vector-signal CSV: "component,index,real,imag" rows keyed by ComponentKey
// text (e.g. "m=3", "m=3,v=-2", "k=1,j=5").
void write_vector_csv(const std::string& path, const VectorSignal& f);

// Interval family JSON: array of {"a": ..., "b": ...} objects.
IntervalFamily read_interval_family(const std::string& path);
void write_interval_family(const std::string& path, const IntervalFamily& fam);

// Cover CSV: "m,v,k,j,a_mv,delta,class" rows in the cover's row order.
void write_cover_csv(const std::string& path, const Cover& cover);

// Maximal-profile CSV: parameter comment line, then "index,x,value" rows.
void write_profile_csv(const std::string& path, const MaximalProfile& prof);

}  // namespace lpk
