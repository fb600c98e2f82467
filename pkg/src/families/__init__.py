"""打ち切り可能な無限の塔の族と、その打ち切りレベルでの診断。"""
