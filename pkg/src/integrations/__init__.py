"""外部数据交换（CSV / JSON 表格）"""
