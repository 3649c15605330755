"""
Work units and checksummed reports
==================================

How a verification is split into units, what a stored report looks like,
and how it can be re-checked without recomputation.
"""

import json

from primsums.runner import (check_record, combined_crc, plan_units, reports_to_lines,
                             run_units)

units = plan_units(2131, "alg3-auto")
print(len(units), "coset units, e.g.", [u.unit_id for u in units[:4]])

# The split is fixed by q and strategy alone, so any number of workers
# produces the same lines in the same order.
lines = reports_to_lines(run_units(units, jobs=1))
rec = json.loads(lines[0])
print(json.dumps({k: rec[k] for k in ("unit", "c_lo", "c_hi", "ok", "m_hist", "crc32")}))

# Every record carries the per-c terminating m, so its CRC can be checked.
print("all records self-consistent:", all(check_record(json.loads(l)) for l in lines))
rec["m"][0] += 1
print("after tampering:", check_record(rec))

# Ranges of c are the unit for per-c strategies.
reports = run_units(plan_units(2131, "hybrid"), jobs=2)
print(f"hybrid over 64 c-ranges: combined crc32 {combined_crc(reports):08x}")
