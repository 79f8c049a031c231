#ifndef NPI_IO_HPP
#define NPI_IO_HPP

#include "npi/fpcore.hpp"
#include "npi/lattice.hpp"
#include "npi/observe.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace npi {

/// Text form: decimal p on line 1, then one decimal coefficient per line,
/// index 0 upward.
void write_polynomial(std::ostream& os, const FpPolynomial& f);
FpPolynomial read_polynomial(std::istream& is);

/// CSV rows t,u,delta with a "t,u,delta" header. Loading re-checks u in [0,p)
/// and reports the offending line on failure.
void write_observations(std::ostream& os, const std::vector<NoisyObservation>& obs);
std::vector<NoisyObservation> read_observations(std::istream& is, const PrimeContext& ctx);

/// Whitespace-separated decimal integers, one row per line, preceded by an
/// "s scale" header line.
void write_lattice(std::ostream& os, const IntegerLattice& lat);
IntegerLattice read_lattice(std::istream& is);

void save_file(const std::string& path, const std::string& contents);
std::string load_file(const std::string& path);

}  // namespace npi

#endif
