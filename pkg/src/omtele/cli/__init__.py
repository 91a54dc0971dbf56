"""Command-line interface: figure datasets, sweeps and the validation report."""
