"""
Utility modules for RMRPA system: codes, channels, transforms, decoders, harness.
"""
