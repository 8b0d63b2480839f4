#pragma once

// JSON encodings shared by the command-line tool and its tests.
//
//   complex     [re, im]
//   polynomial  [c0, c1, ...] of complex values, ascending
//   rational    {"num": poly, "den": poly}; a bare polynomial is accepted on input
//   pair        {"b": rational, "a": rational, "zeros": [{"zeta": complex, "multiplicity": m}], "N": n, "M": m}
//   sequence    {"points": [complex, ...]} or {"family": family}
//   family      {"kind": "power"|"geometric", "c": r, "beta"|"q": r, "count": n,
//                "angles": {"mode": "steinhaus", "seed": s} | {"mode": "fixed", "values": [...]}}
//               or {"kind": "explicit", "radii": [...], "angles": ...}
//
// Non-finite reals are written as null.

#include <string>
#include <vector>

#include <json.hpp>

#include "hbinterp/disk.hpp"
#include "hbinterp/family.hpp"
#include "hbinterp/rational.hpp"

namespace hbinterp::io {

using Json = nlohmann::json;

Json real(double x);
Json to_json(Complex z);
Json to_json(const ComplexPoly& p);
Json to_json(const RationalFn& f);
Json to_json(const BoundaryZeroSet& zeros);
Json to_json(const RationalPair& pair);
Json to_json(const RadiiFamily& radii);
Json to_json(const FamilyDescriptor& family);
Json to_json(const DiskSequence& seq);
Json to_json(const std::vector<Complex>& zs);

// Parsers throw DomainError with the offending path on malformed input.
Complex complex_from_json(const Json& j);
ComplexPoly poly_from_json(const Json& j);
RationalFn rational_from_json(const Json& j);
BoundaryZeroSet zeros_from_json(const Json& j);
/// Parses and checks N, M against the zero set. The pair itself is not
/// re-verified here; see verify_pair.
RationalPair pair_from_json(const Json& j);
RadiiFamily radii_from_json(const Json& j);
FamilyDescriptor family_from_json(const Json& j);
DiskSequence sequence_from_json(const Json& j);
std::vector<Complex> complex_list_from_json(const Json& j);

/// "power:c=1,beta=1,count=4096", "geometric:c=0.5,q=0.7,count=64" or
/// "explicit:0,0.5,0.9". count falls back to default_count when absent.
RadiiFamily parse_family_spec(const std::string& spec, std::size_t default_count);

/// "re" or "re,im".
Complex parse_complex(const std::string& s);

Json read_json_file(const std::string& path);

/// Checks the documented report layout of a subcommand: required keys and
/// their JSON types. Throws DomainError naming the first violation.
void validate_report(const std::string& subcommand, const Json& report);

}  // namespace hbinterp::io
