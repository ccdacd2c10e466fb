#include <iostream>

#include "indexcode/indexcode.hpp"

using namespace indexcode;

int main() {
  const Instance i1 = catalog_get("I1").instance;
  const MaisResult bound = mais(SideInfoGraph(i1));
  std::cout << "I1: " << i1.m() << " users, mais " << bound.value << " witness " << format_set(bound.witness) << "\n";

  const LinearReport lin = verify_linear(i1, LinearCode(i1_binary_matrix(), 1, i1.m()));
  std::cout << "binary code: " << (lin.decodable ? "decodable" : "not decodable") << " at rate " << lin.rate.str() << "\n";

  for (int q : {2, 3, 5}) {
    SearchProblem p{i1, field_make(q), 6};
    const SearchOutcome o = scalar_code_search(p);
    std::cout << "GF(" << q << ") rate 6: " << to_string(o.verdict) << " after " << o.nodes << " nodes\n";
  }
}
