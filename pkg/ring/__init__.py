# ring module
