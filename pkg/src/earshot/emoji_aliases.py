"""Emoji to colon-delimited English alias mapping.

A vendored subset of the standard emoji short-name list (CLDR-derived
names as used by the common `emoji` ecosystem). Covers the high-traffic
social-media emoji plus the symbol emoji that appear as coded terms
(milk, OK hand, bear, frog, pine tree, lightning bolts, ...). Emoji not
in the table are left in place as standalone tokens; the U+FE0F
variation selector and U+200D joiner are stripped before lookup.
"""

EMOJI_ALIASES = {
    # faces
    "\U0001F600": ":grinning_face:",
    "\U0001F601": ":beaming_face_with_smiling_eyes:",
    "\U0001F602": ":face_with_tears_of_joy:",
    "\U0001F603": ":grinning_face_with_big_eyes:",
    "\U0001F604": ":grinning_face_with_smiling_eyes:",
    "\U0001F605": ":grinning_face_with_sweat:",
    "\U0001F606": ":grinning_squinting_face:",
    "\U0001F607": ":smiling_face_with_halo:",
    "\U0001F608": ":smiling_face_with_horns:",
    "\U0001F609": ":winking_face:",
    "\U0001F60A": ":smiling_face_with_smiling_eyes:",
    "\U0001F60B": ":face_savoring_food:",
    "\U0001F60C": ":relieved_face:",
    "\U0001F60D": ":smiling_face_with_heart-eyes:",
    "\U0001F60E": ":smiling_face_with_sunglasses:",
    "\U0001F60F": ":smirking_face:",
    "\U0001F610": ":neutral_face:",
    "\U0001F611": ":expressionless_face:",
    "\U0001F612": ":unamused_face:",
    "\U0001F613": ":downcast_face_with_sweat:",
    "\U0001F614": ":pensive_face:",
    "\U0001F615": ":confused_face:",
    "\U0001F616": ":confounded_face:",
    "\U0001F617": ":kissing_face:",
    "\U0001F618": ":face_blowing_a_kiss:",
    "\U0001F619": ":kissing_face_with_smiling_eyes:",
    "\U0001F61A": ":kissing_face_with_closed_eyes:",
    "\U0001F61B": ":face_with_tongue:",
    "\U0001F61C": ":winking_face_with_tongue:",
    "\U0001F61D": ":squinting_face_with_tongue:",
    "\U0001F61E": ":disappointed_face:",
    "\U0001F61F": ":worried_face:",
    "\U0001F620": ":angry_face:",
    "\U0001F621": ":enraged_face:",
    "\U0001F622": ":crying_face:",
    "\U0001F623": ":persevering_face:",
    "\U0001F624": ":face_with_steam_from_nose:",
    "\U0001F625": ":sad_but_relieved_face:",
    "\U0001F628": ":fearful_face:",
    "\U0001F629": ":weary_face:",
    "\U0001F62A": ":sleepy_face:",
    "\U0001F62B": ":tired_face:",
    "\U0001F62C": ":grimacing_face:",
    "\U0001F62D": ":loudly_crying_face:",
    "\U0001F630": ":anxious_face_with_sweat:",
    "\U0001F631": ":face_screaming_in_fear:",
    "\U0001F632": ":astonished_face:",
    "\U0001F633": ":flushed_face:",
    "\U0001F634": ":sleeping_face:",
    "\U0001F635": ":face_with_crossed-out_eyes:",
    "\U0001F637": ":face_with_medical_mask:",
    "\U0001F641": ":slightly_frowning_face:",
    "\U0001F642": ":slightly_smiling_face:",
    "\U0001F643": ":upside-down_face:",
    "\U0001F644": ":face_with_rolling_eyes:",
    "\U0001F910": ":zipper-mouth_face:",
    "\U0001F911": ":money-mouth_face:",
    "\U0001F912": ":face_with_thermometer:",
    "\U0001F913": ":nerd_face:",
    "\U0001F914": ":thinking_face:",
    "\U0001F915": ":face_with_head-bandage:",
    "\U0001F917": ":hugging_face:",
    "\U0001F920": ":cowboy_hat_face:",
    "\U0001F921": ":clown_face:",
    "\U0001F922": ":nauseated_face:",
    "\U0001F923": ":rolling_on_the_floor_laughing:",
    "\U0001F924": ":drooling_face:",
    "\U0001F925": ":lying_face:",
    "\U0001F928": ":face_with_raised_eyebrow:",
    "\U0001F929": ":star-struck:",
    "\U0001F92A": ":zany_face:",
    "\U0001F92B": ":shushing_face:",
    "\U0001F92C": ":face_with_symbols_on_mouth:",
    "\U0001F92D": ":face_with_hand_over_mouth:",
    "\U0001F92E": ":face_vomiting:",
    "\U0001F92F": ":exploding_head:",
    "\U0001F970": ":smiling_face_with_hearts:",
    "\U0001F971": ":yawning_face:",
    "\U0001F973": ":partying_face:",
    "\U0001F974": ":woozy_face:",
    "\U0001F975": ":hot_face:",
    "\U0001F976": ":cold_face:",
    "\U0001F97A": ":pleading_face:",
    "\U0001FAE0": ":melting_face:",
    "☹": ":frowning_face:",
    "☺": ":smiling_face:",
    # gestures & people
    "\U0001F44C": ":OK_hand:",
    "\U0001F44D": ":thumbs_up:",
    "\U0001F44E": ":thumbs_down:",
    "\U0001F44A": ":oncoming_fist:",
    "\U0001F44B": ":waving_hand:",
    "\U0001F44F": ":clapping_hands:",
    "\U0001F450": ":open_hands:",
    "\U0001F64C": ":raising_hands:",
    "\U0001F64F": ":folded_hands:",
    "\U0001F91D": ":handshake:",
    "\U0001F91E": ":crossed_fingers:",
    "\U0001F926": ":person_facepalming:",
    "\U0001F937": ":person_shrugging:",
    "\U0001F4AA": ":flexed_biceps:",
    "✌": ":victory_hand:",
    "✊": ":raised_fist:",
    "☝": ":index_pointing_up:",
    "\U0001F446": ":backhand_index_pointing_up:",
    "\U0001F447": ":backhand_index_pointing_down:",
    "\U0001F448": ":backhand_index_pointing_left:",
    "\U0001F449": ":backhand_index_pointing_right:",
    # hearts & symbols
    "❤": ":red_heart:",
    "\U0001F499": ":blue_heart:",
    "\U0001F49A": ":green_heart:",
    "\U0001F49B": ":yellow_heart:",
    "\U0001F49C": ":purple_heart:",
    "\U0001F5A4": ":black_heart:",
    "\U0001F90D": ":white_heart:",
    "\U0001F494": ":broken_heart:",
    "\U0001F495": ":two_hearts:",
    "\U0001F496": ":sparkling_heart:",
    "\U0001F497": ":growing_heart:",
    "\U0001F498": ":heart_with_arrow:",
    "\U0001F49E": ":revolving_hearts:",
    "\U0001F4AF": ":hundred_points:",
    "\U0001F4A9": ":pile_of_poo:",
    "\U0001F4A5": ":collision:",
    "\U0001F4A6": ":sweat_droplets:",
    "\U0001F4A4": ":zzz:",
    "\U0001F525": ":fire:",
    "⭐": ":star:",
    "✨": ":sparkles:",
    "\U0001F389": ":party_popper:",
    "\U0001F38A": ":confetti_ball:",
    "\U0001F480": ":skull:",
    "☠": ":skull_and_crossbones:",
    "\U0001F480": ":skull:",
    "\U0001F648": ":see-no-evil_monkey:",
    "\U0001F649": ":hear-no-evil_monkey:",
    "\U0001F64A": ":speak-no-evil_monkey:",
    "\U0001F440": ":eyes:",
    "\U0001F4B0": ":money_bag:",
    "\U0001F4B8": ":money_with_wings:",
    "⚡": ":high_voltage:",
    "❗": ":red_exclamation_mark:",
    "❓": ":red_question_mark:",
    "⚠": ":warning:",
    "\U0001F6A8": ":police_car_light:",
    "\U0001F517": ":link:",
    "\U0001F4E2": ":loudspeaker:",
    "\U0001F3C1": ":chequered_flag:",
    "\U0001F6A9": ":triangular_flag:",
    "\U0001F9E2": ":billed_cap:",
    "\U0001F534": ":red_circle:",
    "\U0001F535": ":blue_circle:",
    "⚫": ":black_circle:",
    "⚪": ":white_circle:",
    "\U0001F7E5": ":red_square:",
    "\U0001F7E6": ":blue_square:",
    "⬛": ":black_large_square:",
    "⬜": ":white_large_square:",
    "\U0001F51E": ":no_one_under_eighteen:",
    "♻": ":recycling_symbol:",
    "\U0001F6AB": ":prohibited:",
    "✅": ":check_mark_button:",
    "❌": ":cross_mark:",
    "\U0001F6D1": ":stop_sign:",
    # animals & nature
    "\U0001F43B": ":bear:",
    "\U0001F438": ":frog:",
    "\U0001F98E": ":lizard:",
    "\U0001F40D": ":snake:",
    "\U0001F419": ":octopus:",
    "\U0001F98B": ":butterfly:",
    "\U0001F41F": ":fish:",
    "\U0001F420": ":tropical_fish:",
    "\U0001F426": ":bird:",
    "\U0001F985": ":eagle:",
    "\U0001F43A": ":wolf:",
    "\U0001F98A": ":fox:",
    "\U0001F436": ":dog_face:",
    "\U0001F415": ":dog:",
    "\U0001F431": ":cat_face:",
    "\U0001F408": ":cat:",
    "\U0001F42D": ":mouse_face:",
    "\U0001F400": ":rat:",
    "\U0001F401": ":mouse:",
    "\U0001F428": ":koala:",
    "\U0001F981": ":lion:",
    "\U0001F42B": ":two-hump_camel:",
    "\U0001F418": ":elephant:",
    "\U0001F993": ":zebra:",
    "\U0001F992": ":giraffe:",
    "\U0001F996": ":T-Rex:",
    "\U0001F995": ":sauropod:",
    "\U0001F577": ":spider:",
    "\U0001F578": ":spider_web:",
    "\U0001F41D": ":honeybee:",
    "\U0001F332": ":evergreen_tree:",
    "\U0001F333": ":deciduous_tree:",
    "\U0001F334": ":palm_tree:",
    "\U0001F335": ":cactus:",
    "\U0001F33B": ":sunflower:",
    "\U0001F339": ":rose:",
    "\U0001F341": ":maple_leaf:",
    "\U0001F343": ":leaf_fluttering_in_wind:",
    "\U0001F30D": ":globe_showing_Europe-Africa:",
    "\U0001F30E": ":globe_showing_Americas:",
    "\U0001F31F": ":glowing_star:",
    "\U0001F308": ":rainbow:",
    "☀": ":sun:",
    "\U0001F319": ":crescent_moon:",
    "\U0001F4A7": ":droplet:",
    "❄": ":snowflake:",
    # food & drink
    "\U0001F95B": ":glass_of_milk:",
    "\U0001F37A": ":beer_mug:",
    "\U0001F377": ":wine_glass:",
    "☕": ":hot_beverage:",
    "\U0001F355": ":pizza:",
    "\U0001F354": ":hamburger:",
    "\U0001F32D": ":hot_dog:",
    "\U0001F35E": ":bread:",
    "\U0001F347": ":grapes:",
    "\U0001F349": ":watermelon:",
    "\U0001F34A": ":tangerine:",
    "\U0001F34E": ":red_apple:",
    "\U0001F352": ":cherries:",
    "\U0001F353": ":strawberry:",
    "\U0001F951": ":avocado:",
    "\U0001F346": ":eggplant:",
    "\U0001F951‍": ":avocado:",
    "\U0001F9C0": ":cheese_wedge:",
    "\U0001F369": ":doughnut:",
    "\U0001F382": ":birthday_cake:",
    # objects & activities
    "\U0001F3C6": ":trophy:",
    "\U0001F3AF": ":bullseye:",
    "\U0001F3AE": ":video_game:",
    "\U0001F3B5": ":musical_note:",
    "\U0001F3B6": ":musical_notes:",
    "\U0001F4F7": ":camera:",
    "\U0001F4F1": ":mobile_phone:",
    "\U0001F4BB": ":laptop:",
    "\U0001F4DA": ":books:",
    "\U0001F4D6": ":open_book:",
    "\U0001F4DD": ":memo:",
    "\U0001F4C8": ":chart_increasing:",
    "\U0001F4C9": ":chart_decreasing:",
    "\U0001F680": ":rocket:",
    "\U0001F697": ":automobile:",
    "✈": ":airplane:",
    "\U0001F6A2": ":ship:",
    "\U0001F3E0": ":house:",
    "\U0001F52B": ":water_pistol:",
    "\U0001F52A": ":kitchen_knife:",
    "\U0001F4A3": ":bomb:",
    "\U0001F56F": ":candle:",
    "\U0001F514": ":bell:",
    "\U0001F511": ":key:",
    "\U0001F512": ":locked:",
    "\U0001F513": ":unlocked:",
    "⌛": ":hourglass_done:",
    "⏰": ":alarm_clock:",
    "\U0001F4A1": ":light_bulb:",
    "\U0001F526": ":flashlight:",
    "\U0001F529": ":nut_and_bolt:",
    "\U0001F528": ":hammer:",
    "⚖": ":balance_scale:",
    "\U0001F52E": ":crystal_ball:",
}

# joiner / variation-selector codepoints stripped before table lookup
EMOJI_TRANSPARENT = {"️", "︎", "‍"}
