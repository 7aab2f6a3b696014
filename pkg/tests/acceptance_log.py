"""Pass/fail lines recorded by the acceptance suite, printed in the pytest summary."""

RESULTS = []
