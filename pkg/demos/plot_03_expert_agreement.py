"""
Agreement with an expert's session labels
=========================================

The model's per-session N/P labels are compared with labels assigned by a
domain expert. Sessions missing on either side are left out.
"""

# %%
from djst.report import compare_to_expert

model = ["N", "N", "P", "N", "N"]
expert = ["N", "N", "P", "N", "P"]
result = compare_to_expert(model, expert)
print(f"accuracy {result.accuracy:.2f} over {result.compared} sessions, mismatched {result.mismatches}")

# %%
# Labels keyed by session survive gaps in the session numbering.
model = {"1": "N", "3": "N", "5": "no data", "7": "P"}
expert = {"1": "N", "3": "P", "5": "N", "7": "P"}
result = compare_to_expert(model, expert)
for session, m, e, match in result.per_session:
    print(session, m, e, "-" if match is None else ("ok" if match else "differs"))
print(f"accuracy {result.accuracy:.3f}")
