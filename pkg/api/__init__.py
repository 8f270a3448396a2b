# HTTP service for the multiset intersection verifier
