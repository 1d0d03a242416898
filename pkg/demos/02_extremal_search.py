"""How large can rho be with e ones?  Order 3, e = 1..10.

``downset`` keeps every slice a down-set under the componentwise order,
``fstar`` packs every slice to the front in dictionary order. The two
agree up to e = 8 and part ways at e = 9, where fstar cannot place the
ninth one next to J_2^3.
"""

from tenspec import search_downset, search_fstar, upper_bound

print(f"{'e':>3} {'e^(2/3)':>10} {'downset':>10} {'fstar':>10}  structure")
for e in range(1, 11):
    down = search_downset(3, e)
    fst = search_fstar(3, e)
    print(
        f"{e:>3} {upper_bound(e, 3):>10.6f} {down.best_lambda:>10.6f} "
        f"{fst.best_lambda:>10.6f}  {down.structure_match.value}"
    )

print()
rep = search_downset(3, 9)
print("Maximisers with 9 ones (canonical forms):")
for T in rep.maximizers:
    print("  ", T.ones)
