"""
Scheduling: proportional fair resource blocks vs round-robin slots
==================================================================

The LTE cell splits each 1 ms subframe into 25 resource blocks and grants
every block to the backlogged UE with the best instantaneous-to-average rate
ratio.  The mmWave cell hands whole 0.125 ms slots to backlogged UEs in
round-robin order.
"""

from sitelink import SchedulerState, nr_slot_schedule, pf_schedule

# ---------------------------------------------------------------------------
# 1. Proportional fair favours the UE that has been served least
# ---------------------------------------------------------------------------

state = SchedulerState(3, window_slots=10, slot_s=0.001)
state.backlog_bytes = [50_000, 50_000, 50_000]
rates = [12e6, 12e6, 12e6]                 # identical channels

print("PF on identical channels: the smoothed averages equalise the grants")
print("  subframe  allocation    smoothed averages (kb/s)")
for subframe in range(6):
    alloc = pf_schedule(state, rates, 25)
    avgs = ", ".join(f"{a / 1e3:7.1f}" for a in state.avg_bps)
    print(f"  {subframe:>8}  {alloc}   [{avgs}]")
    state.backlog_bytes = [50_000, 50_000, 50_000]

# ---------------------------------------------------------------------------
# 2. A better channel wins resources, but only until its average catches up
# ---------------------------------------------------------------------------

state = SchedulerState(2, window_slots=5, slot_s=0.001)
print("\nPF with UE0 at twice the spectral efficiency of UE1:")
print("  subframe  allocation")
for subframe in range(8):
    state.backlog_bytes = [50_000, 50_000]
    alloc = pf_schedule(state, [16e6, 8e6], 25)
    print(f"  {subframe:>8}  {alloc}")

# ---------------------------------------------------------------------------
# 3. Round-robin slots: strict rotation over whoever has data
# ---------------------------------------------------------------------------

state = SchedulerState(4, slot_s=0.000125)
state.backlog_bytes = [1, 1, 0, 1]         # UE2 idle
print("\nRound-robin slot grants (UE2 idle, then joining at slot 5):")
picks = []
for slot in range(10):
    if slot == 5:
        state.backlog_bytes[2] = 1
    picks.append(nr_slot_schedule(state, slot))
print(f"  slots 0-9 -> {picks}")
print("  UE2 is inserted right after its backlog appears; nobody waits more"
      " than one rotation.")
