"""
The three scenario studies, shortened
=====================================

Reproduces the shape of the full studies at reduced duration so the demo
finishes in well under a minute:

  1. 2 Mb/s cameras, 2..20 UEs: LTE saturates near 17 Mb/s, 5G keeps scaling.
  2. 8 cameras, 1..8 Mb/s each: LTE loss passes 50% at 5 Mb/s, 5G stays clean.
  3. 8 moving cameras at 2 Mb/s: 5G collapses past ~40 km/h, LTE barely moves.

Run the presets unmodified (20 s, 5 replications) through the CLI for the
full-quality numbers:  sitelink run --preset 1 --out scenario1.csv
"""

from sitelink import parse_config, run_scenario

SHORT = "duration_s=6\nwarmup_s=1\nreplications=2\n"


def table(title, results, label):
    print(f"\n{title}")
    print(f"  {'rat':>4} {label:>12} {'Mb/s':>8} {'loss':>8} {'delay ms':>9}")
    for r in results:
        delay = "-" if r.mean_delay_s is None else f"{r.mean_delay_s * 1e3:9.2f}"
        print(f"  {r.rat:>4} {r.sweep_value:12g} {r.throughput_bps / 1e6:8.2f}"
              f" {r.loss_rate:8.4f} {delay:>9}")


# 1. UE-count sweep at 2 Mb/s per camera
cfg = parse_config("preset=scenario1\n" + SHORT + "sweep=2,6,10,14,18")
table("Scenario 1: throughput vs number of cameras", run_scenario(cfg), "UEs")
print("  -> LTE flattens at its ~16.9 Mb/s cell capacity; 5G tracks offered load.")

# 2. Offered-rate sweep with 8 cameras
cfg = parse_config("preset=scenario2\n" + SHORT + "sweep=1,3,5,7")
table("Scenario 2: increasing per-camera video rate (8 UEs)",
      run_scenario(cfg), "Mb/s per UE")
print("  -> at 5 Mb/s x 8 the LTE cell must discard over half the packets.")

# 3. Speed sweep with cameras on the machines
cfg = parse_config("preset=scenario3\n" + SHORT + "sweep=0,20,30,40,50,60")
table("Scenario 3: cameras moving with the machines (2 Mb/s, 8 UEs)",
      run_scenario(cfg), "km/h")
print("  -> beam tracking loses the mmWave link beyond ~40 km/h while the"
      " LTE carrier shrugs it off.")
