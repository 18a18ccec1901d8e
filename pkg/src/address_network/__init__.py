"""Address-network reconstruction and longitudinal analysis of UTXO chains."""

__version__ = "1.0.0"

# Internal arithmetic unit: 1 satoshi = 10^4 quanta.
QUANTA_PER_SATOSHI = 10_000
SATOSHI_PER_BTC = 100_000_000

# No single amount can exceed the 21M BTC supply.
MAX_SATOSHI = 21_000_000 * SATOSHI_PER_BTC

# 0.0001 BTC expressed in quanta.
DEFAULT_DUST_THRESHOLD = 10_000 * QUANTA_PER_SATOSHI
