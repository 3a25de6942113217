"""Binary relations on finite sets and their relation-algebra closures."""
