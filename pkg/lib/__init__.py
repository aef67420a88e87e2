# lib module
